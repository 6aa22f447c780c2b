mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

#[derive(Parser, Debug)]
#[command(name = "orbitfold", version, about = "Coadjoint orbits of solvable Lie algebras and finite groupoid pullbacks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    common: Common,
}

#[derive(Args, Debug, Clone)]
pub struct Common {
    /// Seed for every random choice.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Sample count for census, stratification and randomized tests.
    #[arg(long, global = true)]
    pub samples: Option<usize>,
    /// Numeric tolerance for float paths.
    #[arg(long, global = true)]
    pub tol: Option<f64>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Text,
    Json,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Lie algebra computations on an algebra JSON file.
    Lie {
        #[command(subcommand)]
        op: LieOp,
    },
    /// Kostant cascade rank test for a simple root system.
    Cascade {
        #[arg(long)]
        family: String,
        #[arg(long)]
        rank: usize,
    },
    /// Finite groupoid computations on a groupoid or action JSON file.
    Grpd {
        #[command(subcommand)]
        op: GrpdOp,
    },
}

#[derive(Subcommand, Debug)]
pub enum LieOp {
    Validate { file: PathBuf },
    Series { file: PathBuf },
    Roots {
        file: PathBuf,
        #[arg(long)]
        module: Option<PathBuf>,
    },
    Exptest {
        file: PathBuf,
        #[arg(long)]
        module: Option<PathBuf>,
    },
    Coadjoint {
        file: PathBuf,
        /// Comma-separated rational coordinates of ξ.
        #[arg(long, allow_hyphen_values = true)]
        xi: Option<String>,
    },
    Census { file: PathBuf },
    Stratify {
        file: PathBuf,
        #[arg(long)]
        module: Option<PathBuf>,
    },
    ProbeMinusOne { file: PathBuf },
}

#[derive(Subcommand, Debug)]
pub enum GrpdOp {
    Validate { file: PathBuf },
    Classify { file: PathBuf },
    PullbackVerify { file: PathBuf },
    BimoduleVerify {
        file: PathBuf,
        /// `{"theta": [[label, object], …]}`; identity when omitted.
        #[arg(long)]
        theta: Option<PathBuf>,
    },
    Decompose {
        file: PathBuf,
        /// `{"filtration": [[objects of U1], …]}`; a single layer when omitted.
        #[arg(long)]
        filtration: Option<PathBuf>,
    },
    Profile {
        file: PathBuf,
        #[arg(long)]
        filtration: Option<PathBuf>,
    },
    Regrep {
        file: PathBuf,
        /// Object id; every object when omitted.
        #[arg(long, allow_hyphen_values = true)]
        object: Option<String>,
    },
}

/// Failure of a command: usage problems exit with 2, domain errors with 1.
#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Domain { kind: String, message: String },
}

impl CliError {
    pub fn domain(kind: &str, message: impl Into<String>) -> Self {
        CliError::Domain {
            kind: kind.to_string(),
            message: message.into(),
        }
    }

    fn code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Domain { .. } => 1,
        }
    }

    fn to_json(&self) -> Value {
        match self {
            CliError::Usage(m) => json!({"kind": "Usage", "message": m}),
            CliError::Domain { kind, message } => json!({"kind": kind, "message": message}),
        }
    }
}

/// Inputs read so far, hashed into the report digest in order.
#[derive(Default)]
pub struct Inputs {
    hasher: Sha256,
}

impl Inputs {
    pub fn read(&mut self, path: &PathBuf) -> Result<String, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Usage(format!("cannot read {}: {e}", path.display())))?;
        self.hasher.update((text.len() as u64).to_le_bytes());
        self.hasher.update(text.as_bytes());
        Ok(text)
    }

    pub fn literal(&mut self, s: &str) {
        self.hasher.update((s.len() as u64).to_le_bytes());
        self.hasher.update(s.as_bytes());
    }

    fn digest(self) -> String {
        hex::encode(self.hasher.finalize())
    }
}

/// The payload of a successful command.
pub struct Outcome {
    pub result: Value,
    pub warnings: Vec<String>,
}

fn command_name(c: &Command) -> String {
    let kebab = |s: String| {
        let mut out = String::new();
        for (i, ch) in s.chars().enumerate() {
            if ch.is_uppercase() {
                if i > 0 {
                    out.push('-');
                }
                out.extend(ch.to_lowercase());
            } else {
                out.push(ch);
            }
        }
        out
    };
    let head = |dbg: String| kebab(dbg.split([' ', '{', '(']).next().unwrap_or_default().to_string());
    match c {
        Command::Lie { op } => format!("lie {}", head(format!("{op:?}"))),
        Command::Cascade { .. } => "cascade".into(),
        Command::Grpd { op } => format!("grpd {}", head(format!("{op:?}"))),
    }
}

fn render_text(report: &Value) -> String {
    let mut out = String::new();
    if let Value::Object(map) = report {
        for key in ["command", "input_digest"] {
            if let Some(Value::String(s)) = map.get(key) {
                out.push_str(&format!("{key}: {s}\n"));
            }
        }
        for section in ["result", "error"] {
            if let Some(Value::Object(r)) = map.get(section) {
                for (k, v) in r {
                    out.push_str(&format!("{k}: {v}\n"));
                }
            }
        }
        if let Some(Value::Array(ws)) = map.get("warnings") {
            for w in ws {
                if let Value::String(w) = w {
                    out.push_str(&format!("warning: {w}\n"));
                }
            }
        }
    }
    out
}

fn emit(common: &Common, report: &Value) -> Result<(), String> {
    let text = match common.format {
        Format::Json => serde_json::to_string_pretty(report).expect("reports serialize") + "\n",
        Format::Text => render_text(report),
    };
    match &common.out {
        Some(path) => std::fs::write(path, text).map_err(|e| format!("cannot write {}: {e}", path.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let name = command_name(&cli.command);
    let mut inputs = Inputs::default();
    let outcome = match &cli.command {
        Command::Lie { op } => commands::lie(op, &cli.common, &mut inputs),
        Command::Cascade { family, rank } => commands::cascade(family, *rank, &mut inputs),
        Command::Grpd { op } => commands::grpd(op, &mut inputs),
    };
    let digest = inputs.digest();
    let (report, code) = match outcome {
        Ok(o) => (
            json!({"command": name, "input_digest": digest, "result": o.result, "warnings": o.warnings}),
            0,
        ),
        Err(e) => {
            eprintln!("orbitfold: {}", e.to_json()["message"].as_str().unwrap_or_default());
            (
                json!({"command": name, "input_digest": digest, "error": e.to_json(), "warnings": []}),
                e.code(),
            )
        }
    };
    if let Err(msg) = emit(&cli.common, &report) {
        eprintln!("orbitfold: {msg}");
        return ExitCode::from(2);
    }
    ExitCode::from(code)
}
