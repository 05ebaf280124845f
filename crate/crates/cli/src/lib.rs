//! Command implementations for the `perdyn` binary.

pub mod args;
pub mod commands;
pub mod report;
pub mod sweep;

pub use args::{Cli, Command, FieldArgs, Format, SweepKind};
pub use report::{Assertion, Report};

/// What the binary prints and how it exits.
#[derive(Clone, Debug)]
pub struct Outcome {
    pub stdout: String,
    pub stderr: String,
    pub code: i32,
}

pub fn dispatch(cli: &Cli) -> perdyn::Result<Report> {
    match &cli.command {
        Command::Periodic { field, poly } => commands::cmd_periodic(field, poly, cli.precision),
        Command::Dynatomic {
            poly,
            symbolic_c,
            n,
            verify_mobius,
        } => commands::cmd_dynatomic(poly, *symbolic_c, *n, *verify_mobius),
        Command::Classify {
            delta,
            c,
            portrait,
            depth_cap,
            other_prime,
        } => commands::cmd_classify(
            *delta,
            c,
            *portrait,
            *depth_cap,
            *other_prime,
            cli.precision,
        ),
        Command::VerifyBounds {
            p,
            f,
            kind,
            samples,
            levels,
            nonexample,
        } => sweep::cmd_verify_bounds(
            p,
            f,
            *kind,
            *samples,
            *levels,
            *nonexample,
            cli.seed,
            cli.precision,
            cli.budget,
        ),
        Command::Oracle {
            field,
            poly,
            levels,
            dot,
        } => commands::cmd_oracle(
            field,
            poly,
            *levels,
            dot.as_deref(),
            cli.precision,
            cli.budget,
        ),
    }
}

/// Runs a parsed command line. Exit code 0 when every assertion passes, 1
/// when one fails, 2 for bad input.
pub fn run(cli: &Cli) -> Outcome {
    match dispatch(cli) {
        Ok(report) => {
            let code = if report.passed { 0 } else { 1 };
            let stdout = match cli.format {
                Format::Json => report.render_json(),
                Format::Text => report.render_text(),
                Format::Dot => match &report.dot {
                    Some(d) => d.clone(),
                    None => {
                        return Outcome {
                            stdout: String::new(),
                            stderr: "error: --format dot needs `oracle` or `classify --portrait`\n"
                                .into(),
                            code: 2,
                        }
                    }
                },
            };
            Outcome {
                stdout,
                stderr: String::new(),
                code,
            }
        }
        Err(e) => {
            let stdout = match cli.format {
                Format::Json => {
                    let body = serde_json::json!({"error": e.kind(), "message": e.to_string()});
                    format!(
                        "{}\n",
                        serde_json::to_string_pretty(&body).expect("error serializes")
                    )
                }
                _ => String::new(),
            };
            Outcome {
                stdout,
                stderr: format!("error[{}]: {e}\n", e.kind()),
                code: 2,
            }
        }
    }
}
