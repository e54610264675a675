use std::io::Write;
use std::process::ExitCode;

use clap::Parser;
use wiener_quad::cli::{error_json, run, Cli, Format};
use wiener_quad::report::to_json_string;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let rendered = match run(&cli) {
        Ok(r) => r,
        Err(e) => {
            print!("{}", error_json(&e));
            return ExitCode::FAILURE;
        }
    };
    if cli.format == Format::Csv {
        eprint!("{}", to_json_string(&rendered.config));
    }
    let written = match &cli.out {
        Some(path) => std::fs::write(path, &rendered.body),
        None => std::io::stdout().write_all(rendered.body.as_bytes()),
    };
    if let Err(e) = written {
        print!("{}", error_json(&e.into()));
        return ExitCode::FAILURE;
    }
    ExitCode::SUCCESS
}
