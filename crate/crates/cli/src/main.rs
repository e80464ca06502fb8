use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use symkit_core::catalog::builtin;
use symkit_dc::campaign::{self, Options};
use symkit_dc::report::VerificationReport;
use symkit_dc::{runs, schema, spec};

const USAGE: u8 = 2;

#[derive(Parser)]
#[command(
    name = "symkit-dc",
    version,
    about = "Potential symmetries of diffusion-convection equations"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Args)]
struct CampaignArgs {
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Jet points per parameter sample.
    #[arg(long, default_value_t = 200)]
    trials: usize,
    #[arg(long, default_value_t = 5)]
    param_samples: usize,
    /// Relative residual below which a check passes.
    #[arg(long, default_value_t = 1e-8)]
    rtol: f64,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Do not persist the report in the run directory.
    #[arg(long)]
    no_save: bool,
}

impl CampaignArgs {
    fn options(&self) -> Options {
        Options {
            seed: self.seed,
            trials: self.trials,
            param_samples: self.param_samples,
            rtol: self.rtol,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Check every generator of the algebras matching a selector.
    VerifyAlgebra {
        selector: String,
        #[command(flatten)]
        args: CampaignArgs,
    },
    /// Audit the catalogued exact solutions of an equation.
    AuditSolutions {
        equation: String,
        #[command(flatten)]
        args: CampaignArgs,
    },
    /// Apply the transformation described by a JSON spec.
    Transform {
        spec: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// Algebras, resolvers, transformation identities and solutions.
    VerifyAll {
        #[command(flatten)]
        args: CampaignArgs,
    },
    /// Render a persisted report.
    Report {
        /// Run name, file name, path, or `latest`.
        run: String,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Print the built-in catalog as JSON.
    Catalog,
}

fn usage(msg: impl std::fmt::Display) -> ExitCode {
    eprintln!("error: {}", msg);
    ExitCode::from(USAGE)
}

fn emit(report: &VerificationReport, args: &CampaignArgs) -> ExitCode {
    match args.format {
        Format::Text => print!("{}", report.render_text()),
        Format::Json => print!("{}", report.to_json()),
    }
    if !args.no_save {
        match runs::save(&runs::run_dir(), report) {
            Ok(p) => eprintln!("report: {}", p.display()),
            Err(e) => eprintln!("warning: report not saved: {}", e),
        }
    }
    ExitCode::from(report.exit_code() as u8)
}

fn transform(path: &PathBuf, json: bool) -> ExitCode {
    let text = match std::fs::read_to_string(path) {
        Ok(t) => t,
        Err(e) => return usage(format!("{}: {}", path.display(), e)),
    };
    let doc: serde_json::Value = match serde_json::from_str(&text) {
        Ok(d) => d,
        Err(e) => return usage(format!("{}: {}", path.display(), e)),
    };
    if let Err(errs) = schema::validate(schema::SPEC, &doc) {
        return usage(format!(
            "{} violates the spec schema:\n  {}",
            path.display(),
            errs.join("\n  ")
        ));
    }
    let parsed: spec::TransformSpec = match serde_json::from_value(doc) {
        Ok(s) => s,
        Err(e) => return usage(format!("{}: {}", path.display(), e)),
    };
    match spec::run(&builtin(), &parsed) {
        Ok(out) => {
            if json {
                println!(
                    "{}",
                    serde_json::to_string_pretty(&out).expect("output serializes")
                );
            } else {
                print!("{}", out.render_text());
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {}", e);
            ExitCode::from(1)
        }
    }
}

fn report(run: &str, format: Format) -> ExitCode {
    let dir = runs::run_dir();
    let Some(path) = runs::locate(&dir, run) else {
        return usage(format!("no run '{}' in {}", run, dir.display()));
    };
    let doc: serde_json::Value = match std::fs::read_to_string(&path)
        .map_err(|e| e.to_string())
        .and_then(|t| serde_json::from_str(&t).map_err(|e| e.to_string()))
    {
        Ok(d) => d,
        Err(e) => return usage(format!("{}: {}", path.display(), e)),
    };
    if let Err(errs) = schema::validate(schema::REPORT, &doc) {
        return usage(format!(
            "{} is not a valid report:\n  {}",
            path.display(),
            errs.join("\n  ")
        ));
    }
    let rep: VerificationReport = match serde_json::from_value(doc) {
        Ok(r) => r,
        Err(e) => return usage(format!("{}: {}", path.display(), e)),
    };
    match format {
        Format::Text => print!("{}", rep.render_text()),
        Format::Json => print!("{}", rep.to_json()),
    }
    ExitCode::SUCCESS
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Command::VerifyAlgebra { selector, args } => {
            match campaign::verify_algebra(&builtin(), &selector, &args.options()) {
                Ok(r) => emit(&r, &args),
                Err(e) => usage(e),
            }
        }
        Command::AuditSolutions { equation, args } => {
            match campaign::audit_solutions(&builtin(), &equation, &args.options()) {
                Ok(r) => emit(&r, &args),
                Err(e) => usage(e),
            }
        }
        Command::VerifyAll { args } => {
            emit(&campaign::verify_all(&builtin(), &args.options()), &args)
        }
        Command::Transform { spec, json } => transform(&spec, json),
        Command::Report { run, format } => report(&run, format),
        Command::Catalog => {
            println!(
                "{}",
                serde_json::to_string_pretty(&builtin()).expect("catalog serializes")
            );
            ExitCode::SUCCESS
        }
    }
}
